#include <stdio.h>

long count_descent_steps(long n) {
    long steps = 0;
    while (n > 1) {
        if (n % 2 == 0) {
            n = n / 2;
        } else {
            n = n - 1;
        }
        steps = steps + 1;
    }
    return steps;
}

int main(void) {
    long first_input;
    if (scanf("%ld", &first_input) != 1) {
        return 2;
    }
    printf("%ld\n", count_descent_steps(first_input));
    return 0;
}
