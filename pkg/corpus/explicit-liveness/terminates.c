// VERDICT: TRUE
int main() {
  int n = 0;
  while (n < 5) {
    n = n + 1;
    __assert_live(n == 100);
  }
  return 0;
}
