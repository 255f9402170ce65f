#include <stdio.h>

int splay_window_extrema(int n) {
    int vals[9];
    int floor_seen = 0;
    int peak_seen = 0;
    for (int i = 0; i < 9; i++) {
        vals[i] = ((i * n + 3) % 23 + 23) % 23;
    }
    floor_seen = vals[0];
    peak_seen = vals[0];
    for (int i = 1; i < 9; i++) {
        if (vals[i] < floor_seen) {
            floor_seen = vals[i];
        }
        if (vals[i] > peak_seen) {
            peak_seen = vals[i];
        }
    }
    return peak_seen * 100 + floor_seen;
}

int main(void) {
    int first_input;
    if (scanf("%d", &first_input) != 1) {
        return 2;
    }
    printf("%d\n", splay_window_extrema(first_input));
    return 0;
}
