// VERDICT: TRUE
int main() {
  int i = 0;
  while (i < 4) {
    int j = 0;
    while (j < i) {
      j = j + 1;
    }
    i = i + 1;
  }
  return 0;
}
