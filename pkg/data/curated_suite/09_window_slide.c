#include <stdio.h>

int pace_window_slide(int n, int w) {
    int values[10];
    int best = 0;
    if (w < 1) {
        w = 1;
    }
    if (w > 10) {
        w = 10;
    }
    for (int i = 0; i < 10; i++) {
        values[i] = (i * n) % 17;
    }
    for (int lead = 0; lead + w <= 10; lead++) {
        int gathered = 0;
        for (int i = lead; i < lead + w; i++) {
            gathered = gathered + values[i];
        }
        if (gathered > best) {
            best = gathered;
        }
    }
    return best;
}

int main(void) {
    int first_input;
    int second_input;
    if (scanf("%d %d", &first_input, &second_input) != 2) {
        return 2;
    }
    printf("%d\n", pace_window_slide(first_input, second_input));
    return 0;
}
