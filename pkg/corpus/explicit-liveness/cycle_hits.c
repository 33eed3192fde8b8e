// VERDICT: TRUE
int main() {
  int i = 0;
  while (1) {
    i = i + 1;
    if (i > 3) {
      i = 0;
    }
    __assert_live(i == 2);
  }
  return 0;
}
