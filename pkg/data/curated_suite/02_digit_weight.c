#include <stdio.h>

long fold_digit_weight(long n) {
    long acc = 0;
    long place = 1;
    if (n < 0) {
        n = -n;
    }
    while (n > 0) {
        acc = acc + (n % 10) * place;
        place = place + 1;
        n = n / 10;
    }
    return acc;
}

int main(void) {
    long first_input;
    if (scanf("%ld", &first_input) != 1) {
        return 2;
    }
    printf("%ld\n", fold_digit_weight(first_input));
    return 0;
}
