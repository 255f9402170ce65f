#include <stdio.h>

long grind_power_residue(long base, long expo, long pm) {
    long kept = 1;
    if (pm < 2) {
        pm = 2;
    }
    if (expo < 0) {
        expo = 0;
    }
    base = base % pm;
    if (base < 0) {
        base = base + pm;
    }
    while (expo > 0) {
        if (expo % 2 == 1) {
            kept = (kept * base) % pm;
        }
        base = (base * base) % pm;
        expo = expo / 2;
    }
    return kept;
}

int main(void) {
    long first_input;
    long second_input;
    long third_input;
    if (scanf("%ld %ld %ld", &first_input, &second_input, &third_input) != 3) {
        return 2;
    }
    printf("%ld\n", grind_power_residue(first_input, second_input, third_input));
    return 0;
}
