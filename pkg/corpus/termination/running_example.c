// VERDICT: TRUE
int main() {
  unsigned int x = nondet();
  assert(x >= 0);
  int y = 1;
  while (x < 127) {
    x = x + y;
    y = y + 1;
  }
  return 0;
}
