# Package marker for condcolor
