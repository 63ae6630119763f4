int main() {
    int score, g;
    scanf("%d", &score);
    if (score > 90)
        g = 4;
    else if (score >= 70)
        g = 3;
    else if (score >= 50)
        g = 2;
    else
        g = 0;
    printf("%d", g);
    return 0;
}
