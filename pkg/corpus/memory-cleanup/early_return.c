// VERDICT: FALSE
int main() {
  void *p = malloc(8);
  int c = nondet();
  if (c == 0) {
    return 1;
  }
  free(p);
  return 0;
}
