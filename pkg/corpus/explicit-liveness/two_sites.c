// VERDICT: FALSE
int main() {
  int i = 0;
  while (1) {
    i = 1 - i;
    __assert_live(i == 0);
    __assert_live(i == 2);
  }
  return 0;
}
