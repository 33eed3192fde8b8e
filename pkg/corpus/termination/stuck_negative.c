// VERDICT: FALSE
int main() {
  int x = nondet();
  while (x != 0) {
    if (x > 0) {
      x = x - 1;
    }
  }
  return 0;
}
