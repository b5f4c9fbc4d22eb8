#include <stdio.h>

int main() {
    int n, d;
    scanf("%d", &n);
    if (n < 0)
        n = -n;
    d = 1;
    while (n >= 10) {
        n = n / 10;
        d++;
    }
    printf("%d\n", d);
    return 0;
}
