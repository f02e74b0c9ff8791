# Package marker for condcolor modules
