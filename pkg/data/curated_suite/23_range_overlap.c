#include <stdio.h>

int tally_range_overlap(int a1, int a2, int b1, int b2) {
    int lo = a1;
    int hi = a2;
    if (b1 > lo) {
        lo = b1;
    }
    if (b2 < hi) {
        hi = b2;
    }
    if (hi > lo) {
        return hi - lo;
    }
    return 0;
}

int main(void) {
    int first_input;
    int second_input;
    int third_input;
    int fourth_input;
    if (scanf("%d %d %d %d", &first_input, &second_input, &third_input, &fourth_input) != 4) {
        return 2;
    }
    printf("%d\n", tally_range_overlap(first_input, second_input, third_input, fourth_input));
    return 0;
}
