// VERDICT: FALSE
int main() {
  int a = -2147483647 - 1;
  int b = nondet();
  if (b < 0) {
    int q = a / b;
  }
  return 0;
}
