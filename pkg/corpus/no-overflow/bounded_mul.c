// VERDICT: TRUE
int main() {
  int x = nondet();
  if (x < 1000) {
    if (x > 0 - 1000) {
      int y = x * 1000;
    }
  }
  return 0;
}
