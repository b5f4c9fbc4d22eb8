#include <stdio.h>
int main() {
    int n;
    int f = 1;
    scanf("%d", &n);
    while (n > 2) {
        f *= n;
        n = n - 1;
    }
    printf("%d\n", f);
    return 0;
}
