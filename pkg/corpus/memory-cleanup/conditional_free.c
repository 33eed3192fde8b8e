// VERDICT: TRUE
int main() {
  void *p = malloc(4);
  int c = nondet();
  if (c > 0) {
    free(p);
  } else {
    free(p);
  }
  return 0;
}
