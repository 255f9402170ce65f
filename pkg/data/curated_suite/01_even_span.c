#include <stdio.h>

int sum_even_span(int lo, int hi) {
    int total = 0;
    for (int i = lo; i < hi; i++) {
        if (i % 2 == 0) {
            total = total + i;
        }
    }
    return total;
}

int main(void) {
    int first_input;
    int second_input;
    if (scanf("%d %d", &first_input, &second_input) != 2) {
        return 2;
    }
    printf("%d\n", sum_even_span(first_input, second_input));
    return 0;
}
