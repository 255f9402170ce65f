#include <stdio.h>

int weigh_triangle_sides(int a, int b, int c) {
    if (a <= 0 || b <= 0 || c <= 0) {
        return 0;
    }
    if (a + b <= c || b + c <= a || a + c <= b) {
        return 0;
    }
    if (a == b && b == c) {
        return 3;
    }
    if (a == b || b == c || a == c) {
        return 2;
    }
    return 1;
}

int main(void) {
    int first_input;
    int second_input;
    int third_input;
    if (scanf("%d %d %d", &first_input, &second_input, &third_input) != 3) {
        return 2;
    }
    printf("%d\n", weigh_triangle_sides(first_input, second_input, third_input));
    return 0;
}
