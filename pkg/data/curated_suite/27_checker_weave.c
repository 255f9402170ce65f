#include <stdio.h>

int quilt_checker_weave(int rows, int cols) {
    int acc = 0;
    if (rows < 0) {
        rows = 0;
    }
    if (rows > 12) {
        rows = 12;
    }
    if (cols < 0) {
        cols = 0;
    }
    if (cols > 12) {
        cols = 12;
    }
    for (int r = 0; r < rows; r++) {
        for (int q = 0; q < cols; q++) {
            if ((r + q) % 2 == 0) {
                acc = acc + r * q;
            } else {
                acc = acc - (r + q);
            }
        }
    }
    return acc;
}

int main(void) {
    int first_input;
    int second_input;
    if (scanf("%d %d", &first_input, &second_input) != 2) {
        return 2;
    }
    printf("%d\n", quilt_checker_weave(first_input, second_input));
    return 0;
}
