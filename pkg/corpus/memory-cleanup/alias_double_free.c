// VERDICT: FALSE
int main() {
  void *p = malloc(4);
  void *q = p;
  free(p);
  int c = nondet();
  if (c == 1) {
    free(q);
  }
  return 0;
}
