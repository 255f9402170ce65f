#include <stdio.h>

int chase_gcd_loop(int a, int b) {
    if (a < 0) {
        a = -a;
    }
    if (b < 0) {
        b = -b;
    }
    while (b != 0) {
        int held = a % b;
        a = b;
        b = held;
    }
    return a;
}

int main(void) {
    int first_input;
    int second_input;
    if (scanf("%d %d", &first_input, &second_input) != 2) {
        return 2;
    }
    printf("%d\n", chase_gcd_loop(first_input, second_input));
    return 0;
}
