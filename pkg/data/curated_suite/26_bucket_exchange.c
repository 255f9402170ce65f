#include <stdio.h>

int pour_bucket_exchange(int cap_a, int cap_b, int rounds) {
    int held_a = 0;
    int held_b = 0;
    if (cap_a < 1) {
        cap_a = 1;
    }
    if (cap_b < 1) {
        cap_b = 1;
    }
    if (rounds < 0) {
        rounds = 0;
    }
    if (rounds > 40) {
        rounds = 40;
    }
    held_a = cap_a;
    for (int i = 0; i < rounds; i++) {
        int room = cap_b - held_b;
        int moved = held_a;
        if (moved > room) {
            moved = room;
        }
        held_a = held_a - moved;
        held_b = held_b + moved;
        if (held_a == 0) {
            held_a = cap_a;
        }
        if (held_b == cap_b) {
            held_b = 0;
        }
    }
    return held_a * 100 + held_b;
}

int main(void) {
    int first_input;
    int second_input;
    int third_input;
    if (scanf("%d %d %d", &first_input, &second_input, &third_input) != 3) {
        return 2;
    }
    printf("%d\n", pour_bucket_exchange(first_input, second_input, third_input));
    return 0;
}
