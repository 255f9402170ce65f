#include <stdio.h>

int trim_saturating_diff(int a, int b) {
    int d = a - b;
    if (d < 0) {
        d = 0;
    }
    if (d > 255) {
        d = 255;
    }
    return d;
}

int main(void) {
    int first_input;
    int second_input;
    if (scanf("%d %d", &first_input, &second_input) != 2) {
        return 2;
    }
    printf("%d\n", trim_saturating_diff(first_input, second_input));
    return 0;
}
