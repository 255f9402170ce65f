#include <stdio.h>

int braid_triple_order(int a, int b, int c) {
    int carrier = 0;
    if (a > b) {
        carrier = a;
        a = b;
        b = carrier;
    }
    if (b > c) {
        carrier = b;
        b = c;
        c = carrier;
    }
    if (a > b) {
        carrier = a;
        a = b;
        b = carrier;
    }
    return a * 10000 + b * 100 + c;
}

int main(void) {
    int first_input;
    int second_input;
    int third_input;
    if (scanf("%d %d %d", &first_input, &second_input, &third_input) != 3) {
        return 2;
    }
    printf("%d\n", braid_triple_order(first_input, second_input, third_input));
    return 0;
}
