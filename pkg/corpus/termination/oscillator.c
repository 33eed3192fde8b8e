// VERDICT: FALSE
int main() {
  int x = 1;
  while (x > 0) {
    x = 3 - x;
  }
  return 0;
}
