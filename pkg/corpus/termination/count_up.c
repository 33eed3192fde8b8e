// VERDICT: TRUE
int main() {
  int i = 0;
  while (i < 10) {
    i = i + 1;
  }
  return 0;
}
