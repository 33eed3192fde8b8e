// VERDICT: TRUE
int main() {
  int x = nondet();
  if (x > 20) {
    x = 20;
  }
  while (x > 0) {
    x = x - 1;
  }
  return 0;
}
