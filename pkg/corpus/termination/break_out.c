// VERDICT: TRUE
int main() {
  int n = 0;
  while (1) {
    n = n + 1;
    if (n >= 7) {
      break;
    }
  }
  return 0;
}
