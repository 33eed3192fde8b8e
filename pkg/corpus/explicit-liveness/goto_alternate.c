// VERDICT: TRUE
int main() {
  int c = 0;
L:
  c = 1 - c;
  __assert_live(c == 1);
  goto L;
  return 0;
}
