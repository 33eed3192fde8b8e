// VERDICT: FALSE
int main() {
  int x = nondet();
  int y = 0;
  while (x > 0) {
    y = 1 - y;
  }
  return 0;
}
