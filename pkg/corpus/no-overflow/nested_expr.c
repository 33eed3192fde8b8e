// VERDICT: FALSE
int main() {
  int x = nondet();
  int y = nondet();
  int z = (x - 3) * 2 + y;
  return 0;
}
