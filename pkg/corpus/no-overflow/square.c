// VERDICT: FALSE
int main() {
  int x = nondet();
  int y = x * x;
  return 0;
}
