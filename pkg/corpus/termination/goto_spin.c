// VERDICT: FALSE
int main() {
  int c = nondet();
L:
  c = c + 0;
  if (c == 1) {
    goto L;
  }
  return 0;
}
