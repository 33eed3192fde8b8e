// VERDICT: TRUE
int main() {
  int x = nondet();
  int y = 0;
  if (x > 0) {
    y = x - 1;
  }
  return 0;
}
