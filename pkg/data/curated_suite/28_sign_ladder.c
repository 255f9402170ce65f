#include <stdio.h>

int hinge_sign_ladder(int x) {
    if (x < -100) {
        return -2;
    }
    if (x < 0) {
        return -1;
    }
    if (x == 0) {
        return 0;
    }
    if (x <= 100) {
        return 1;
    }
    return 2;
}

int main(void) {
    int first_input;
    if (scanf("%d", &first_input) != 1) {
        return 2;
    }
    printf("%d\n", hinge_sign_ladder(first_input));
    return 0;
}
