// VERDICT: TRUE
int main() {
  int x = nondet();
  if (x != -2147483647 - 1) {
    x = -x;
  }
  return 0;
}
