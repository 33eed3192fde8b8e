extern void reach_error(void);
extern int nondet(void);
extern void __assert_live(int);
extern void *malloc(unsigned long);
extern void *calloc(unsigned long, unsigned long);
extern void *realloc(void *, unsigned long);
extern void free(void *);

int main() {
    unsigned int x = nondet();
    if (!(x >= 0)) reach_error();
    int y = 1;
    while (x < 127) {
        x = x + y;
        if (!(!(1 > 0 && y > 2147483647 - 1 || 1 < 0 && y < -2147483648 - 1))) reach_error();
        y = y + 1;
    }
    return 0;
}
