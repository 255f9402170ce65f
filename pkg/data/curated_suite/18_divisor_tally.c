#include <stdio.h>

int scan_divisor_tally(int n) {
    int found = 0;
    if (n < 1) {
        return 0;
    }
    for (int i = 1; i <= n; i++) {
        if (n % i == 0) {
            found = found + 1;
        }
    }
    return found;
}

int main(void) {
    int first_input;
    if (scanf("%d", &first_input) != 1) {
        return 2;
    }
    printf("%d\n", scan_divisor_tally(first_input));
    return 0;
}
