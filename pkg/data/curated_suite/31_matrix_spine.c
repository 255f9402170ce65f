#include <stdio.h>
#include <stddef.h>

int stitch_matrix_spine(int n) {
    int grid[16];
    int acc = 0;
    for (size_t q = 0; q < 16; q++) {
        grid[q] = n + q * 3;
    }
    for (size_t q = 0; q < 16; q = q + 5) {
        acc = acc + grid[q];
    }
    return acc;
}

int main(void) {
    int first_input;
    if (scanf("%d", &first_input) != 1) {
        return 2;
    }
    printf("%d\n", stitch_matrix_spine(first_input));
    return 0;
}
