// VERDICT: FALSE
int main() {
  int i = 0;
  while (i < 3) {
    int j = nondet();
    while (j > 10) {
      j = 160 - j;
    }
    i = i + 1;
  }
  return 0;
}
