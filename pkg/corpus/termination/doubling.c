// VERDICT: TRUE
int main() {
  int x = nondet();
  while (x > 0 && x < 100) {
    x = x * 2;
  }
  return 0;
}
