#include <stdio.h>

long trace_mixing_hash(int n, int salt) {
    long mix = salt;
    int visits = 0;
    for (int i = 0; i < n; i++) {
        mix = mix * 31 + i;
        visits = visits + 1;
    }
    return mix + visits * 1000;
}

int main(void) {
    int first_input;
    int second_input;
    if (scanf("%d %d", &first_input, &second_input) != 2) {
        return 2;
    }
    printf("%ld\n", trace_mixing_hash(first_input, second_input));
    return 0;
}
