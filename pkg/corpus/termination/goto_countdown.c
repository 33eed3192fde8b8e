// VERDICT: TRUE
int main() {
  int c = nondet();
  if (c > 5) {
    c = 5;
  }
L:
  if (c > 0) {
    c = c - 1;
    goto L;
  }
  return 0;
}
