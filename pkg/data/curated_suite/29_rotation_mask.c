#include <stdio.h>

long twist_rotation_mask(long bits, int by) {
    long kept = bits & 0xFFFFFF;
    int turn = ((by % 24) + 24) % 24;
    if (turn == 0) {
        return kept;
    }
    return ((kept << turn) | (kept >> (24 - turn))) & 0xFFFFFF;
}

int main(void) {
    long first_input;
    int second_input;
    if (scanf("%ld %d", &first_input, &second_input) != 2) {
        return 2;
    }
    printf("%ld\n", twist_rotation_mask(first_input, second_input));
    return 0;
}
