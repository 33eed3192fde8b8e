// VERDICT: TRUE
int main() {
  int i = 0;
  while (i < 2) {
    void *q = malloc(1);
    free(q);
    i = i + 1;
  }
  return 0;
}
