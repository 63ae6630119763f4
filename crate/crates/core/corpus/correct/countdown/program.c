int main() {
    int n;
    scanf("%d", &n);
    while (n > 0) {
        printf("%d", n);
        n--;
    }
    return 0;
}
