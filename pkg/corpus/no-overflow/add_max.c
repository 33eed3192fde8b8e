// VERDICT: FALSE
int main() {
  int x = nondet();
  int y = x + 1;
  return 0;
}
