// VERDICT: FALSE
int main() {
  void *p = malloc(4);
  void *q = realloc(p, 8);
  return 0;
}
