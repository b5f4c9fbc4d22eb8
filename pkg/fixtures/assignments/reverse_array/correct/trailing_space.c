#include <stdio.h>
int main() {
    int v[10], n, i;
    scanf("%d", &n);
    i = 0;
    while (i < n) {
        scanf("%d", &v[i]);
        i++;
    }
    i = n - 1;
    while (i >= 0) {
        printf("%d ", v[i]);
        i--;
    }
    printf("\n");
    return 0;
}
