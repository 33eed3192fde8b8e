// VERDICT: TRUE
int main() {
  int x = nondet();
  int y = x / 2;
  int z = -y;
  return 0;
}
