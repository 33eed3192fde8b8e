// VERDICT: TRUE
int main() {
  int n = nondet();
  while (n > 0) {
    n = nondet();
    __assert_live(n > 0);
  }
  return 0;
}
