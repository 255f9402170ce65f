#include <stdio.h>

int wade_threshold_cross(int limit, int gain) {
    int level = 0;
    int ticks = 0;
    if (gain < 1) {
        gain = 1;
    }
    while (level < limit && ticks < 100) {
        level = level + gain + ticks;
        ticks = ticks + 1;
    }
    return ticks;
}

int main(void) {
    int first_input;
    int second_input;
    if (scanf("%d %d", &first_input, &second_input) != 2) {
        return 2;
    }
    printf("%d\n", wade_threshold_cross(first_input, second_input));
    return 0;
}
