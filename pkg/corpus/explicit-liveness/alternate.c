// VERDICT: TRUE
int main() {
  int x = 0;
  while (1) {
    x = 1 - x;
    __assert_live(x == 1);
  }
  return 0;
}
