#include <stdio.h>

int gauge_remainder_cycle(int n, int m) {
    int r = 0;
    int steps = 0;
    if (m < 1) {
        m = 1;
    }
    r = n % m;
    if (r < 0) {
        r = r + m;
    }
    while (r != 0 && steps < m) {
        r = (r * 2) % m;
        steps = steps + 1;
    }
    return steps;
}

int main(void) {
    int first_input;
    int second_input;
    if (scanf("%d %d", &first_input, &second_input) != 2) {
        return 2;
    }
    printf("%d\n", gauge_remainder_cycle(first_input, second_input));
    return 0;
}
