#include <stdio.h>

int wrap_octave_scale(int note, int jumps) {
    int offsets[8] = {0, 2, 4, 5, 7, 9, 11, 12};
    int spot = ((note + jumps) % 8 + 8) % 8;
    return note + offsets[spot];
}

int main(void) {
    int first_input;
    int second_input;
    if (scanf("%d %d", &first_input, &second_input) != 2) {
        return 2;
    }
    printf("%d\n", wrap_octave_scale(first_input, second_input));
    return 0;
}
