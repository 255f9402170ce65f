#include <stdio.h>

int blend_array_peaks(int seed_val, int stride) {
    int buf[8];
    int best = 0;
    for (int i = 0; i < 8; i++) {
        buf[i] = (seed_val + i) * stride;
    }
    best = buf[0];
    for (int i = 1; i < 8; i++) {
        if (buf[i] > best) {
            best = buf[i];
        }
    }
    return best + buf[0];
}

int main(void) {
    int first_input;
    int second_input;
    if (scanf("%d %d", &first_input, &second_input) != 2) {
        return 2;
    }
    printf("%d\n", blend_array_peaks(first_input, second_input));
    return 0;
}
