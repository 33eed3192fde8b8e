// VERDICT: FALSE
int main() {
  int x = 0;
  while (1) {
    x = 0;
    __assert_live(x == 1);
  }
  return 0;
}
