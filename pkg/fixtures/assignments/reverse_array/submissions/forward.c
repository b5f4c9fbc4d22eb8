#include <stdio.h>
int main() {
    int v[10], n, i;
    scanf("%d", &n);
    i = 0;
    while (i < n) {
        scanf("%d", &v[i]);
        i++;
    }
    i = 0;
    while (i < n) {
        printf("%d ", v[i]);
        i++;
    }
    printf("\n");
    return 0;
}
