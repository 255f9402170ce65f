#include <stdio.h>

long knit_fibonacci_rungs(int n) {
    long lower = 0;
    long upper = 1;
    if (n < 0) {
        n = 0;
    }
    if (n > 90) {
        n = 90;
    }
    for (int i = 0; i < n; i++) {
        long lifted = lower + upper;
        lower = upper;
        upper = lifted;
    }
    return lower;
}

int main(void) {
    int first_input;
    if (scanf("%d", &first_input) != 1) {
        return 2;
    }
    printf("%ld\n", knit_fibonacci_rungs(first_input));
    return 0;
}
