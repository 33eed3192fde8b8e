// VERDICT: FALSE
int main() {
  int x = nondet();
  int y = -x - 2;
  return 0;
}
