#include <stdio.h>

int clamp_window_mean(int a, int b, int c) {
    int mean = (a + b + c) / 3;
    if (mean < 0) {
        mean = 0;
    }
    if (mean > 100) {
        mean = 100;
    }
    return mean;
}

int main(void) {
    int first_input;
    int second_input;
    int third_input;
    if (scanf("%d %d %d", &first_input, &second_input, &third_input) != 3) {
        return 2;
    }
    printf("%d\n", clamp_window_mean(first_input, second_input, third_input));
    return 0;
}
