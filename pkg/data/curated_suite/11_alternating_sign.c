#include <stdio.h>

int fold_alternating_sign(int n) {
    int acc = 0;
    for (int i = 1; i <= n; i++) {
        if (i % 2 == 1) {
            acc = acc + i;
        } else {
            acc = acc - i;
        }
    }
    return acc;
}

int main(void) {
    int first_input;
    if (scanf("%d", &first_input) != 1) {
        return 2;
    }
    printf("%d\n", fold_alternating_sign(first_input));
    return 0;
}
