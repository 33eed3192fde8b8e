// VERDICT: TRUE
int main() {
  void *p = malloc(4);
  free(p);
  return 0;
}
