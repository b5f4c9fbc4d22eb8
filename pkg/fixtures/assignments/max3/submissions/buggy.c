int main(){ // finds maximum of 3 numbers
   int f,s,t;
   scanf("%d %d %d", &f, &s, &t);
   if (f < s && f >= t) //fix: f >= s
      printf("%d\n", f);
   else if (s > f && s >= t)
      printf("%d\n", s);
   else if (t < f && t < s) //fix: t > f and t > s
      printf("%d\n", t);

   return 0;
}
