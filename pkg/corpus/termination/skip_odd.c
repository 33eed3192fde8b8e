// VERDICT: TRUE
int main() {
  int i = 0;
  int s = 0;
  while (i < 6) {
    i = i + 1;
    if (i % 2 == 1) {
      continue;
    }
    s = s + i;
  }
  return 0;
}
