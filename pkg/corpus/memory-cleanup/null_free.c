// VERDICT: TRUE
int main() {
  void *p = 0;
  free(p);
  return 0;
}
