extern void reach_error(void);
extern int nondet(void);
extern void __assert_live(int);
extern void *malloc(unsigned long);
extern void *calloc(unsigned long, unsigned long);
extern void *realloc(void *, unsigned long);
extern void free(void *);

int main() {
    void *__ptr_track = 0;
    void *__ptr_freed = 0;
    unsigned int x = nondet();
    if (!(x >= 0)) reach_error();
    int y = 1;
    while (x < 127) {
        x = x + y;
        y = y + 1;
    }
    if (!(__ptr_track == 0)) reach_error();
    return 0;
}
