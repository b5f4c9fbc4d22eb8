#include <stdio.h>
int main() {
    int n;
    int f = 1;
    scanf("%d", &n);
    while (n > 1) {
        f *= n;
        n = n - 1;
    }
    printf("%d\n", f);
    return 0;
}
