// VERDICT: FALSE
int main() {
  void *p = malloc(4);
  return 0;
}
