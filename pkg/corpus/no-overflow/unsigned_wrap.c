// VERDICT: TRUE
int main() {
  unsigned int u = nondet();
  u = u + 1;
  u = u * 3;
  return 0;
}
