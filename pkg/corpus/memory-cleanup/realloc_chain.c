// VERDICT: TRUE
int main() {
  void *p = malloc(4);
  p = realloc(p, 8);
  p = realloc(p, 16);
  free(p);
  return 0;
}
