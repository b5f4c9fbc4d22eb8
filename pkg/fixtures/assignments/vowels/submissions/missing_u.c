#include <stdio.h>

int main() {
    char c;
    int count = 0;
    scanf("%c", &c);
    while (c != '\n') {
        if (c == 'a' || c == 'e' || c == 'i' || c == 'o')
            count++;
        scanf("%c", &c);
    }
    printf("%d\n", count);
    return 0;
}
