// VERDICT: FALSE
int main() {
  int i = 0;
  while (1) {
    i = nondet();
    __assert_live(i == 2);
  }
  return 0;
}
