// VERDICT: FALSE
int main() {
  int i = 0;
  while (i < 3) {
    void *q = calloc(1, 4);
    if (i != 1) {
      free(q);
    }
    i = i + 1;
  }
  return 0;
}
