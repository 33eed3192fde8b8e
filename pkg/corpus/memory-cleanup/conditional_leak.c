// VERDICT: FALSE
int main() {
  void *p = malloc(4);
  int c = nondet();
  if (c > 0) {
    free(p);
  }
  return 0;
}
