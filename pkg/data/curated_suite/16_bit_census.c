#include <stdio.h>

int shift_bit_census(long mask) {
    int census = 0;
    if (mask < 0) {
        mask = -mask;
    }
    while (mask != 0) {
        if (mask % 2 != 0) {
            census = census + 1;
        }
        mask = mask / 2;
    }
    return census;
}

int main(void) {
    long first_input;
    if (scanf("%ld", &first_input) != 1) {
        return 2;
    }
    printf("%d\n", shift_bit_census(first_input));
    return 0;
}
