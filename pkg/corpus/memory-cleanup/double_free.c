// VERDICT: FALSE
int main() {
  void *p = malloc(4);
  free(p);
  free(p);
  return 0;
}
