#include <stdio.h>

int rank_symbol_bucket(int code) {
    if (code < 32) {
        return 0;
    }
    if (code < 48) {
        return 1;
    }
    if (code < 58) {
        return 2;
    }
    if (code < 65) {
        return 3;
    }
    if (code < 91) {
        return 4;
    }
    if (code < 97) {
        return 5;
    }
    if (code < 123) {
        return 6;
    }
    return 7;
}

int main(void) {
    int first_input;
    if (scanf("%d", &first_input) != 1) {
        return 2;
    }
    printf("%d\n", rank_symbol_bucket(first_input));
    return 0;
}
