// VERDICT: FALSE
int main() {
  int s = 0;
  int i = 0;
  while (i < 40) {
    s = s + 100000000;
    i = i + 1;
  }
  return 0;
}
