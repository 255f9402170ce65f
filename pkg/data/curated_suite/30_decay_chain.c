#include <stdio.h>

double seep_decay_chain(double start, int rounds) {
    if (rounds < 0) {
        rounds = 0;
    }
    if (rounds > 50) {
        rounds = 50;
    }
    while (rounds > 0) {
        start = start / 2.0 + 1.0;
        rounds = rounds - 1;
    }
    return start;
}

int main(void) {
    double first_input;
    int second_input;
    if (scanf("%lf %d", &first_input, &second_input) != 2) {
        return 2;
    }
    printf("%.4f\n", seep_decay_chain(first_input, second_input));
    return 0;
}
