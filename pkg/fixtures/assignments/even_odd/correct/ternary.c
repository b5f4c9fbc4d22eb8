#include <stdio.h>
int main() {
    int n, r;
    scanf("%d", &n);
    r = n % 2;
    if (r != 0) {
        printf("odd\n");
    } else {
        printf("even\n");
    }
    return 0;
}
