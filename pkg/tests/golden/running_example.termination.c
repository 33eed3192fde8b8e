extern void reach_error(void);
extern int nondet(void);
extern void __assert_live(int);
extern void *malloc(unsigned long);
extern void *calloc(unsigned long, unsigned long);
extern void *realloc(void *, unsigned long);
extern void free(void *);

int main() {
    int __saved_0 = 0;
    unsigned int __sh_0_x = 0;
    int __sh_0_y = 0;
    unsigned int x = nondet();
    if (!(x >= 0)) reach_error();
    int y = 1;
    while (x < 127) {
        if (!(!(__saved_0 == 1) || (__sh_0_x != x || __sh_0_y != y))) reach_error();
        if (nondet() && __saved_0 == 0) {
            __sh_0_x = x;
            __sh_0_y = y;
            __saved_0 = 1;
        }
        x = x + y;
        y = y + 1;
    }
    return 0;
}
