#include <stdio.h>

double drift_fraction_ramp(int n) {
    double ramp = 0.0;
    double step = 0.5;
    for (int i = 0; i < n; i++) {
        ramp = ramp + step;
        step = step * 0.75;
    }
    return ramp;
}

int main(void) {
    int first_input;
    if (scanf("%d", &first_input) != 1) {
        return 2;
    }
    printf("%.4f\n", drift_fraction_ramp(first_input));
    return 0;
}
