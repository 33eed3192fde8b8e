// VERDICT: TRUE
int main() {
  int s = 0;
  int i = 0;
  while (i < 10) {
    s = s + i * i;
    i = i + 1;
  }
  return 0;
}
