#include <stdio.h>

int mirror_parity_code(int x) {
    if (x < 0) {
        if (x % 2 == 0) {
            return 1;
        } else {
            return 2;
        }
    }
    if (x < 100) {
        if (x % 2 == 0) {
            return 3;
        } else {
            return 4;
        }
    }
    if (x % 2 == 0) {
        return 5;
    }
    return 6;
}

int main(void) {
    int first_input;
    if (scanf("%d", &first_input) != 1) {
        return 2;
    }
    printf("%d\n", mirror_parity_code(first_input));
    return 0;
}
