#include <stdio.h>

long carve_bounded_power(int base, int reps) {
    long grown = 1;
    if (reps < 0) {
        reps = 0;
    }
    if (reps > 12) {
        reps = 12;
    }
    for (int i = 0; i < reps; i++) {
        grown = grown * base;
    }
    return grown;
}

int main(void) {
    int first_input;
    int second_input;
    if (scanf("%d %d", &first_input, &second_input) != 2) {
        return 2;
    }
    printf("%ld\n", carve_bounded_power(first_input, second_input));
    return 0;
}
